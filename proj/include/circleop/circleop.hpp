#pragma once

#include "circleop/algebra.hpp"
#include "circleop/error.hpp"
#include "circleop/io.hpp"
#include "circleop/linalg.hpp"
#include "circleop/literal.hpp"
#include "circleop/norm.hpp"
#include "circleop/operator.hpp"
#include "circleop/spectral.hpp"
#include "circleop/structure.hpp"
#include "circleop/symbol.hpp"
