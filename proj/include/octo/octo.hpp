#pragma once

#include "octo/errors.hpp"
#include "octo/real.hpp"
#include "octo/jet.hpp"
#include "octo/octonion.hpp"
#include "octo/random.hpp"
#include "octo/point.hpp"
#include "octo/hermitian.hpp"
#include "octo/field.hpp"
#include "octo/catalog.hpp"
#include "octo/differential.hpp"
#include "octo/geometry.hpp"
#include "octo/field_text.hpp"
#include "octo/quadrature.hpp"
#include "octo/operators.hpp"
#include "octo/perron.hpp"
#include "octo/report.hpp"
#include "octo/suites.hpp"
