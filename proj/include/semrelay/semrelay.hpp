#pragma once

#include "semrelay/barrier.hpp"
#include "semrelay/config.hpp"
#include "semrelay/oracle_baselines.hpp"
#include "semrelay/penalty_solver.hpp"
#include "semrelay/sca_bounds.hpp"
#include "semrelay/subproblems.hpp"
#include "semrelay/sweep.hpp"
#include "semrelay/system_model.hpp"
