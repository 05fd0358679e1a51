#ifndef DIVGRAPH_ERRORS_HPP
#define DIVGRAPH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace divgraph {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DIVGRAPH_DEFINE_ERROR(Name)          \
  class Name : public Error {                \
   public:                                   \
    explicit Name(const std::string& what)   \
        : Error(std::string(#Name ": ") + what) {} \
  }

DIVGRAPH_DEFINE_ERROR(InvalidGraphSpec);
DIVGRAPH_DEFINE_ERROR(DisconnectedGraph);
DIVGRAPH_DEFINE_ERROR(NonPositiveEdgeLength);
DIVGRAPH_DEFINE_ERROR(DuplicateEdgeId);
DIVGRAPH_DEFINE_ERROR(PointNotOnGraph);
DIVGRAPH_DEFINE_ERROR(GraphMismatch);
DIVGRAPH_DEFINE_ERROR(InvalidRange);
DIVGRAPH_DEFINE_ERROR(DegreeMismatch);
DIVGRAPH_DEFINE_ERROR(NonEffectiveDivisor);
DIVGRAPH_DEFINE_ERROR(ParameterOutOfRange);
DIVGRAPH_DEFINE_ERROR(CertificateFailed);
DIVGRAPH_DEFINE_ERROR(ZeroDegreeInput);
DIVGRAPH_DEFINE_ERROR(KappaTooSmall);
DIVGRAPH_DEFINE_ERROR(NotInHull);
DIVGRAPH_DEFINE_ERROR(ParseError);

#undef DIVGRAPH_DEFINE_ERROR

}  // namespace divgraph

#endif  // DIVGRAPH_ERRORS_HPP
