// Copyright 2026 The spikets Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace spikets {

// Base of every exception thrown by the library. The CLI maps each subclass
// to a distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated precondition: dimension mismatch, out-of-range argument.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Malformed input files, failed downloads, checksum mismatches.
class DataError : public Error {
 public:
  using Error::Error;
};

// Cached file no longer matches its recorded checksum.
class ChecksumError : public DataError {
 public:
  using DataError::DataError;
};

// NaN/Inf produced during training or inference.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Invalid or unknown configuration keys/values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

#define SPIKETS_REQUIRE(cond, msg)                 \
  do {                                             \
    if (!(cond)) throw ::spikets::ContractError(msg); \
  } while (0)

}  // namespace spikets
