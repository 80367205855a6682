// Copyright 2026 The Probseg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PROBSEG_PROBSEG_HPP
#define PROBSEG_PROBSEG_HPP

#include "probseg/correspondence.hpp"
#include "probseg/domain.hpp"
#include "probseg/errors.hpp"
#include "probseg/harness.hpp"
#include "probseg/io.hpp"
#include "probseg/metrics.hpp"
#include "probseg/report.hpp"
#include "probseg/rng.hpp"
#include "probseg/segmentation.hpp"
#include "probseg/simplex.hpp"

#endif  // PROBSEG_PROBSEG_HPP
