#pragma once

#include "gcdcensus/admissibility.hpp"
#include "gcdcensus/bigint.hpp"
#include "gcdcensus/counting.hpp"
#include "gcdcensus/density.hpp"
#include "gcdcensus/errors.hpp"
#include "gcdcensus/index_set.hpp"
#include "gcdcensus/model.hpp"
#include "gcdcensus/padic.hpp"
#include "gcdcensus/primes.hpp"
