#pragma once

#include "cellkit/dot.hpp"
#include "cellkit/epistemic.hpp"
#include "cellkit/error.hpp"
#include "cellkit/formula.hpp"
#include "cellkit/model.hpp"
#include "cellkit/model_io.hpp"
#include "cellkit/refinement.hpp"
#include "cellkit/scenarios.hpp"
#include "cellkit/semantics.hpp"
