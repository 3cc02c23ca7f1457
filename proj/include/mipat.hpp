#pragma once

#include "mipat/chi_squared.hpp"
#include "mipat/counting.hpp"
#include "mipat/error.hpp"
#include "mipat/inference.hpp"
#include "mipat/linalg.hpp"
#include "mipat/mdi_test.hpp"
#include "mipat/multiple_testing.hpp"
#include "mipat/partition.hpp"
#include "mipat/random.hpp"
#include "mipat/simulation.hpp"
