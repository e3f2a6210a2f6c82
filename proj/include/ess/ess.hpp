#pragma once

#include "ess/baselines.hpp"
#include "ess/cost.hpp"
#include "ess/domain.hpp"
#include "ess/dp_oracle.hpp"
#include "ess/feasibility.hpp"
#include "ess/rcga.hpp"
#include "ess/report.hpp"
#include "ess/rng.hpp"
#include "ess/scenario_io.hpp"
