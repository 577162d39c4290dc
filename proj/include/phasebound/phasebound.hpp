#ifndef PHASEBOUND_PHASEBOUND_HPP
#define PHASEBOUND_PHASEBOUND_HPP

#include "asymptotic_limit.hpp"
#include "bound_kernel.hpp"
#include "canonical_povm.hpp"
#include "errors.hpp"
#include "gauss_legendre.hpp"
#include "oracle.hpp"
#include "state_space.hpp"
#include "symmetric_eigen.hpp"

#endif // PHASEBOUND_PHASEBOUND_HPP
