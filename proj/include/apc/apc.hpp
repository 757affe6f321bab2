#pragma once

#include "apc/apcode.hpp"
#include "apc/ensemble.hpp"
#include "apc/errors.hpp"
#include "apc/field.hpp"
#include "apc/harness.hpp"
#include "apc/listrecovery.hpp"
#include "apc/numeric.hpp"
#include "apc/permutation.hpp"
#include "apc/potential.hpp"
#include "apc/rng.hpp"
