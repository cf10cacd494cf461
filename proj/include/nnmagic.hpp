// Copyright 2026 The nnmagic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "nnmagic/errors.hpp"
#include "nnmagic/fit.hpp"
#include "nnmagic/free_fermion.hpp"
#include "nnmagic/lanczos.hpp"
#include "nnmagic/lp_simplex.hpp"
#include "nnmagic/magic.hpp"
#include "nnmagic/measurement.hpp"
#include "nnmagic/mhc.hpp"
#include "nnmagic/nelder_mead.hpp"
#include "nnmagic/optim.hpp"
#include "nnmagic/parallel.hpp"
#include "nnmagic/pauli.hpp"
#include "nnmagic/qcore.hpp"
#include "nnmagic/rng.hpp"
#include "nnmagic/rom.hpp"
#include "nnmagic/scan.hpp"
#include "nnmagic/tfim.hpp"

namespace nnmagic {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nnmagic
