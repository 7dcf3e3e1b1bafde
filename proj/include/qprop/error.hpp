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

#ifndef QPROP_ERROR_HPP_
#define QPROP_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace qprop {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownElement : public Error {
 public:
  explicit UnknownElement(const std::string& name)
      : Error("unknown element '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class SizeLimitExceeded : public Error {
 public:
  using Error::Error;
};

// Raised when a lattice cannot even be assembled (missing 0/1, duplicate
// names). Law failures are never thrown; they land in a VerificationReport.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class LatticeMismatch : public Error {
 public:
  LatticeMismatch() : Error("operands belong to different lattices") {}
};

class NotOrthomodular : public Error {
 public:
  explicit NotOrthomodular(const std::string& lattice)
      : Error("lattice '" + lattice + "' is not a verified orthomodular lattice") {}
};

class InvalidActualitySet : public Error {
 public:
  using Error::Error;
};

class GuardViolation : public Error {
 public:
  explicit GuardViolation(const std::string& constraint)
      : Error("guard violated: " + constraint), constraint_(constraint) {}
  const std::string& constraint() const { return constraint_; }

 private:
  std::string constraint_;
};

class UnboundVariable : public Error {
 public:
  explicit UnboundVariable(const std::string& var)
      : Error("unbound variable '" + var + "'") {}
};

class UnknownMap : public Error {
 public:
  explicit UnknownMap(const std::string& name)
      : Error("unknown propagation map '" + name + "'") {}
};

class BadBinding : public Error {
 public:
  using Error::Error;
};

}  // namespace qprop

#endif  // QPROP_ERROR_HPP_
