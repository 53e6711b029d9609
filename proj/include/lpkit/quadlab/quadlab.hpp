#pragma once

#include "lpkit/quadlab/de_quadrature.hpp"
#include "lpkit/quadlab/integrals.hpp"
