#pragma once

#include "pwsgd/constraints.hpp"
#include "pwsgd/coreset.hpp"
#include "pwsgd/datasets.hpp"
#include "pwsgd/error.hpp"
#include "pwsgd/experiment.hpp"
#include "pwsgd/leverage.hpp"
#include "pwsgd/linalg.hpp"
#include "pwsgd/matrix_io.hpp"
#include "pwsgd/plot_data.hpp"
#include "pwsgd/precondition.hpp"
#include "pwsgd/rla.hpp"
#include "pwsgd/serialization.hpp"
#include "pwsgd/sgd.hpp"
#include "pwsgd/sketch.hpp"
#include "pwsgd/theory.hpp"
