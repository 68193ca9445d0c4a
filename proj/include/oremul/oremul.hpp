#pragma once

#include "oremul/bench.hpp"
#include "oremul/charp.hpp"
#include "oremul/conversions.hpp"
#include "oremul/errors.hpp"
#include "oremul/field.hpp"
#include "oremul/json_io.hpp"
#include "oremul/laurent_mul.hpp"
#include "oremul/matrix.hpp"
#include "oremul/mul_weyl.hpp"
#include "oremul/ntt.hpp"
#include "oremul/opcount.hpp"
#include "oremul/ore.hpp"
#include "oremul/poly.hpp"
#include "oremul/random.hpp"
#include "oremul/reductions.hpp"
#include "oremul/theta_mul.hpp"
