#pragma once

#include "scatter1d/amplitudes.hpp"
#include "scatter1d/box_oracle.hpp"
#include "scatter1d/dos.hpp"
#include "scatter1d/errors.hpp"
#include "scatter1d/levinson.hpp"
#include "scatter1d/potentials.hpp"
#include "scatter1d/special.hpp"
#include "scatter1d/thermo.hpp"
