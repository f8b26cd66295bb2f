#pragma once

// Umbrella header.

#include "dlindblad/config.hpp"
#include "dlindblad/deformation.hpp"
#include "dlindblad/density_matrix.hpp"
#include "dlindblad/environment.hpp"
#include "dlindblad/errors.hpp"
#include "dlindblad/evolve.hpp"
#include "dlindblad/fock_ops.hpp"
#include "dlindblad/format.hpp"
#include "dlindblad/generator.hpp"
#include "dlindblad/log.hpp"
#include "dlindblad/moments.hpp"
#include "dlindblad/populations.hpp"
