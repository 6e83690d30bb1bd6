// SPDX-License-Identifier: Apache-2.0
//
// latred - lattice-reduction-aided MIMO detection toolkit
// Copyright (C) 2026 The latred authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace latred {

// Base class of every error raised by the library. Callers that only need
// "something went wrong" catch this; tests match the concrete subclasses.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class NonFiniteInput : public Error {
  public:
    using Error::Error;
};

class DimensionError : public Error {
  public:
    using Error::Error;
};

class SingularPivot : public Error {
  public:
    using Error::Error;
};

class RankDeficient : public Error {
  public:
    using Error::Error;
};

// Raised by the reduction algorithms when a diagonal entry of R vanishes.
class ZeroDiagonal : public Error {
  public:
    using Error::Error;
};

class IterationOverflow : public Error {
  public:
    using Error::Error;
};

class NotUnimodular : public Error {
  public:
    using Error::Error;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

class ZeroInput : public Error {
  public:
    using Error::Error;
};

} // namespace latred
