// Copyright 2026 The sketchlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "sketchlab/balance.hpp"
#include "sketchlab/countsketch.hpp"
#include "sketchlab/errors.hpp"
#include "sketchlab/gaussian.hpp"
#include "sketchlab/generate.hpp"
#include "sketchlab/gram.hpp"
#include "sketchlab/io.hpp"
#include "sketchlab/linalg.hpp"
#include "sketchlab/matrix.hpp"
#include "sketchlab/parallel.hpp"
#include "sketchlab/randnla.hpp"
#include "sketchlab/random.hpp"
#include "sketchlab/rownorms.hpp"
