#pragma once

#include "semap/catalog.hpp"
#include "semap/expansion.hpp"
#include "semap/filter.hpp"
#include "semap/grid.hpp"
#include "semap/io.hpp"
#include "semap/object_boost.hpp"
#include "semap/pipeline.hpp"
#include "semap/planner.hpp"
#include "semap/prob.hpp"
#include "semap/simulator.hpp"
