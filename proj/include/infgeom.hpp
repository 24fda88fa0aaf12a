#pragma once

#include "infgeom/chart.hpp"
#include "infgeom/detectors.hpp"
#include "infgeom/distribution.hpp"
#include "infgeom/errors.hpp"
#include "infgeom/expr.hpp"
#include "infgeom/expr_text.hpp"
#include "infgeom/jet.hpp"
#include "infgeom/laplacian.hpp"
#include "infgeom/linalg.hpp"
#include "infgeom/metric.hpp"
#include "infgeom/polynomial.hpp"
#include "infgeom/scalar.hpp"
#include "infgeom/weil_algebra.hpp"
#include "infgeom/weil_element.hpp"
#include "infgeom/weil_json.hpp"
