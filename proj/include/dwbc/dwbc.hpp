#ifndef DWBC_DWBC_HPP
#define DWBC_DWBC_HPP

#include "dwbc/closedform.hpp"
#include "dwbc/ellpoly.hpp"
#include "dwbc/enumerate.hpp"
#include "dwbc/errors.hpp"
#include "dwbc/linalg.hpp"
#include "dwbc/params.hpp"
#include "dwbc/random.hpp"
#include "dwbc/rmatrix.hpp"
#include "dwbc/theta.hpp"

#endif
