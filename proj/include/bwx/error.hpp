/*
 * Copyright 2026 The bwx Authors
 *
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

namespace bwx {

// Every library failure derives from Error; kind() gives a stable short tag
// that the command-line tool prints in its one-line error message.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define BWX_DEFINE_ERROR(Name, tag)                                   \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(tag, what) {}      \
  };

BWX_DEFINE_ERROR(FormatError, "format")
BWX_DEFINE_ERROR(IoError, "io")
BWX_DEFINE_ERROR(PreconditionError, "precondition")
BWX_DEFINE_ERROR(DegenerateError, "degenerate")
BWX_DEFINE_ERROR(StabilityError, "stability")
BWX_DEFINE_ERROR(IndexError, "index")
BWX_DEFINE_ERROR(InputError, "input")
BWX_DEFINE_ERROR(CodebookError, "codebook")
BWX_DEFINE_ERROR(StreamError, "stream")

#undef BWX_DEFINE_ERROR

inline void require(bool cond, const std::string& what) {
  if (!cond) throw PreconditionError(what);
}

}  // namespace bwx
