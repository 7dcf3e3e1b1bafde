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

#ifndef QPROP_FORMATS_HPP_
#define QPROP_FORMATS_HPP_

#include "qprop/formats/corpus.hpp"
#include "qprop/formats/derivation_io.hpp"
#include "qprop/formats/formula_io.hpp"
#include "qprop/formats/lattice_io.hpp"
#include "qprop/formats/map_io.hpp"
#include "qprop/formats/source.hpp"

#endif  // QPROP_FORMATS_HPP_
