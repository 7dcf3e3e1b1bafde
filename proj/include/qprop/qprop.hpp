// Copyright 2026 The qprop Authors
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

#ifndef QPROP_QPROP_HPP_
#define QPROP_QPROP_HPP_

#include "qprop/axioms.hpp"
#include "qprop/builders.hpp"
#include "qprop/crosscheck.hpp"
#include "qprop/derivation.hpp"
#include "qprop/element_set.hpp"
#include "qprop/error.hpp"
#include "qprop/families.hpp"
#include "qprop/formats.hpp"
#include "qprop/formula.hpp"
#include "qprop/join_map.hpp"
#include "qprop/kernel.hpp"
#include "qprop/lattice.hpp"
#include "qprop/mutation.hpp"
#include "qprop/parallel.hpp"
#include "qprop/powerset_map.hpp"
#include "qprop/propagation.hpp"
#include "qprop/sampling.hpp"

#endif  // QPROP_QPROP_HPP_
