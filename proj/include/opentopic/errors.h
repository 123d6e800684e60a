/* Copyright 2026 The OpenTopic Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef OPENTOPIC_ERRORS_H_
#define OPENTOPIC_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace opentopic {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input that is readable but violates a format or contract. CLI exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A malformed line in one of the input files.
class ParseError : public ValidationError {
 public:
  ParseError(std::string file, std::size_t line, const std::string& what);

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

// File missing, unreadable or unwritable. CLI exit code 2.
class IoError : public Error {
 public:
  using Error::Error;
};

// A scoring backend could not produce a valid answer.
class ScorerUnavailable : public Error {
 public:
  using Error::Error;
};

}  // namespace opentopic

#endif  // OPENTOPIC_ERRORS_H_
