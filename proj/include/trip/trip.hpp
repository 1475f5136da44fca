#pragma once

#include "core.hpp"
#include "expr.hpp"
#include "gauss_kuzmin.hpp"
#include "hilbert.hpp"
#include "quadrature.hpp"
#include "s3_mat.hpp"
#include "special.hpp"
#include "spectral.hpp"
#include "tables.hpp"
#include "transfer.hpp"
