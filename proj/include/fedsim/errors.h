// Copyright 2026 The fedsim Authors. All Rights Reserved.
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

#ifndef FEDSIM_ERRORS_H_
#define FEDSIM_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fedsim {

// Base for every error raised by the simulator.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vector lengths or model dimensions disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A scalar argument is outside its valid range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Compression ratios cannot be equalized to the benchmark time.
class SchedulingError : public Error {
 public:
  using Error::Error;
};

// Structurally invalid input file (wrong column count, empty file).
class SchemaError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fedsim

#endif  // FEDSIM_ERRORS_H_
