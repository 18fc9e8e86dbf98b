#pragma once

#include "crnd/rational.hpp"
#include "crnd/scalar.hpp"
#include "crnd/linalg.hpp"
#include "crnd/jet.hpp"
#include "crnd/jet_matrix.hpp"
#include "crnd/compose.hpp"
#include "crnd/expr.hpp"
#include "crnd/manifold.hpp"
#include "crnd/engine.hpp"
#include "crnd/job.hpp"
#include "crnd/corpus.hpp"
#include "crnd/invariance.hpp"
