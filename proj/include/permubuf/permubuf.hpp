#pragma once

// Umbrella header for the permubuf library: exact analysis of the Random
// Permutation online packet-buffering algorithm (m buffers, capacity B = 1).

#include "permubuf/checked_math.hpp"
#include "permubuf/errors.hpp"
#include "permubuf/exact.hpp"
#include "permubuf/monte_carlo.hpp"
#include "permubuf/opt.hpp"
#include "permubuf/permutation.hpp"
#include "permubuf/schedule.hpp"
#include "permubuf/schedule_io.hpp"
#include "permubuf/search.hpp"
#include "permubuf/simulate.hpp"
