#pragma once

// Umbrella header for the arsys library.

#include "arsys/error.hpp"
#include "arsys/checked.hpp"
#include "arsys/exponents.hpp"
#include "arsys/lattice.hpp"
#include "arsys/bicharacter.hpp"
#include "arsys/groupoid.hpp"
#include "arsys/equivalence.hpp"
#include "arsys/subsystems.hpp"
#include "arsys/catalog.hpp"
#include "arsys/io.hpp"
