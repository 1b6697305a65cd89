#pragma once

#include "casimir/constants.hpp"
#include "casimir/dielectric.hpp"
#include "casimir/errors.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/polylog.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/reflection.hpp"
#include "casimir/spectrum.hpp"
#include "casimir/types.hpp"
