// Copyright 2026 The smos Authors
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

#ifndef SMOS_ERROR_HPP_
#define SMOS_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace smos
{

/// Raised for malformed input files; carries the 1-based line number.
class ParseError : public std::runtime_error
{
public:
  ParseError(std::size_t line, const std::string & message)
  : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line)
  {
  }

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

}  // namespace smos

#endif  // SMOS_ERROR_HPP_
