#pragma once

#include "tfg/penrose/cyclo.hpp"
#include "tfg/penrose/element.hpp"
#include "tfg/penrose/geometry.hpp"
#include "tfg/penrose/qf.hpp"
#include "tfg/penrose/quotient.hpp"
#include "tfg/penrose/tiling.hpp"
