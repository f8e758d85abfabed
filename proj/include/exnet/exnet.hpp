#pragma once

#include "exnet/analysis.hpp"
#include "exnet/enumerate.hpp"
#include "exnet/error.hpp"
#include "exnet/experiments.hpp"
#include "exnet/graph.hpp"
#include "exnet/graph_json.hpp"
#include "exnet/quantity.hpp"
#include "exnet/rational.hpp"
#include "exnet/serialize.hpp"
#include "exnet/session.hpp"
#include "exnet/solver/lp.hpp"
#include "exnet/solver/max_flow.hpp"
