#pragma once

#include "sparsedecomp/decompose.hpp"
#include "sparsedecomp/errors.hpp"
#include "sparsedecomp/external.hpp"
#include "sparsedecomp/io.hpp"
#include "sparsedecomp/lattice.hpp"
#include "sparsedecomp/mixed_volume.hpp"
#include "sparsedecomp/numeric.hpp"
#include "sparsedecomp/parser.hpp"
#include "sparsedecomp/polynomial.hpp"
#include "sparsedecomp/solver.hpp"
