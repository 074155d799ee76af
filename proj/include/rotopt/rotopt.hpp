#pragma once

#include "rotopt/channel_objective.hpp"
#include "rotopt/constellation.hpp"
#include "rotopt/csv.hpp"
#include "rotopt/error.hpp"
#include "rotopt/lie_rotations.hpp"
#include "rotopt/optimizer.hpp"
#include "rotopt/rng.hpp"
#include "rotopt/version.hpp"
