// Copyright 2026 The privplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PRIVPLAN_ERRORS_H_
#define PRIVPLAN_ERRORS_H_

#include <stdexcept>
#include <string>

namespace privplan {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument is outside the domain of the operation.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Two vectors were defined over different alpha grids.
class GridError : public Error {
 public:
  using Error::Error;
};

// A charge was refused by the privacy filter of a block.
class BudgetExceededError : public Error {
 public:
  using Error::Error;
};

// An allocation no longer fits the ledgers it is applied to.
class ConflictError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent configuration / input file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ReportError : public Error {
 public:
  using Error::Error;
};

}  // namespace privplan

#endif  // PRIVPLAN_ERRORS_H_
