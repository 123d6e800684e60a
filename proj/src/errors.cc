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

#include "opentopic/errors.h"

#include <utility>

namespace opentopic {

ParseError::ParseError(std::string file, std::size_t line,
                       const std::string& what)
    : ValidationError(file + ":" + std::to_string(line) + ": " + what),
      file_(std::move(file)),
      line_(line) {}

}  // namespace opentopic
