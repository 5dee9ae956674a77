#pragma once

#include "fieldcover/bench.hpp"
#include "fieldcover/csv.hpp"
#include "fieldcover/errors.hpp"
#include "fieldcover/field_model.hpp"
#include "fieldcover/geometry.hpp"
#include "fieldcover/matching.hpp"
#include "fieldcover/planners.hpp"
#include "fieldcover/rng.hpp"
#include "fieldcover/svg.hpp"
#include "fieldcover/tsp.hpp"
#include "fieldcover/verification.hpp"
