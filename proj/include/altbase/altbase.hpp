#pragma once

#include "altbase/base.hpp"
#include "altbase/density.hpp"
#include "altbase/digit_set.hpp"
#include "altbase/errors.hpp"
#include "altbase/expression.hpp"
#include "altbase/measure.hpp"
#include "altbase/numeric.hpp"
#include "altbase/oracle.hpp"
#include "altbase/piecewise_linear.hpp"
#include "altbase/transform.hpp"
