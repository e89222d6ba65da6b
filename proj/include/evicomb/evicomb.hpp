#pragma once

#include "combination.hpp"
#include "conditional.hpp"
#include "error.hpp"
#include "frame.hpp"
#include "mass.hpp"
#include "probability.hpp"
#include "ratio.hpp"
#include "relation.hpp"
#include "relational_model.hpp"
