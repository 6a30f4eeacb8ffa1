/*
 * Copyright 2026 The cmdlearn Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace cmdlearn {

// Base of all library errors. The CLI maps each subclass to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept = 0;
};

// Bad arguments from the caller: unknown algorithm ids, k < 1, bad config.
class UsageError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 1; }
};

// Malformed or inconsistent input data.
class DataError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

// A structural invariant of a model or dataset was found broken.
class InvariantError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

[[noreturn]] void throw_invariant(const std::string& what);

}  // namespace cmdlearn
