#ifndef DIVGRAPH_DIVGRAPH_HPP
#define DIVGRAPH_DIVGRAPH_HPP

#include "divgraph/closed_subset.hpp"
#include "divgraph/divisor.hpp"
#include "divgraph/divisor_space.hpp"
#include "divgraph/errors.hpp"
#include "divgraph/graph.hpp"
#include "divgraph/io.hpp"
#include "divgraph/line_search.hpp"
#include "divgraph/potential.hpp"
#include "divgraph/projection.hpp"
#include "divgraph/pwl_function.hpp"
#include "divgraph/reduced.hpp"
#include "divgraph/signed_divisor.hpp"

#endif  // DIVGRAPH_DIVGRAPH_HPP
