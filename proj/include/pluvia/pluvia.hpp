#pragma once

#include "pluvia/checkpoint.hpp"
#include "pluvia/config.hpp"
#include "pluvia/conv1d.hpp"
#include "pluvia/csv.hpp"
#include "pluvia/dataset.hpp"
#include "pluvia/dense.hpp"
#include "pluvia/errors.hpp"
#include "pluvia/evaluation.hpp"
#include "pluvia/gradcheck.hpp"
#include "pluvia/lstm.hpp"
#include "pluvia/model.hpp"
#include "pluvia/rng.hpp"
#include "pluvia/svg.hpp"
#include "pluvia/tensor.hpp"
#include "pluvia/training.hpp"
#include "pluvia/verify.hpp"
