#pragma once

#include "amech/algebroid.hpp"
#include "amech/atiyah.hpp"
#include "amech/dual_poisson.hpp"
#include "amech/hamilton_jacobi.hpp"
#include "amech/hamiltonian.hpp"
#include "amech/integrate.hpp"
#include "amech/lagrangian.hpp"
#include "amech/legendre.hpp"
#include "amech/models.hpp"
#include "amech/random_fields.hpp"
#include "amech/serialize.hpp"
#include "amech/tulczyjew.hpp"
