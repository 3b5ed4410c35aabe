#pragma once

#include "cfi/digest.hpp"
#include "cfi/equilibrium.hpp"
#include "cfi/errors.hpp"
#include "cfi/fourier_series.hpp"
#include "cfi/functionals.hpp"
#include "cfi/inequalities.hpp"
#include "cfi/measures.hpp"
#include "cfi/operators.hpp"
#include "cfi/random.hpp"
#include "cfi/scalar.hpp"
#include "cfi/transport.hpp"
#include "cfi/io.hpp"
