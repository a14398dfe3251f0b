#pragma once

#include "floquet_sg/contour.hpp"
#include "floquet_sg/elliptic.hpp"
#include "floquet_sg/errors.hpp"
#include "floquet_sg/hill.hpp"
#include "floquet_sg/monodromy.hpp"
#include "floquet_sg/output.hpp"
#include "floquet_sg/quadrature.hpp"
#include "floquet_sg/stability.hpp"
#include "floquet_sg/wave.hpp"
