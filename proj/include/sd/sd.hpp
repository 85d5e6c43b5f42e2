#pragma once

#include "sd/compensated.hpp"
#include "sd/complex_math.hpp"
#include "sd/error.hpp"
#include "sd/euler.hpp"
#include "sd/exact_sums.hpp"
#include "sd/functions.hpp"
#include "sd/limit_stats.hpp"
#include "sd/sieve.hpp"
