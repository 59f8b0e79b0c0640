// Copyright 2026 The submodkit Authors.
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

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace submod {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SUBMOD_DEFINE_ERROR(Name)            \
  class Name : public Error {                \
   public:                                   \
    using Error::Error;                      \
  }

SUBMOD_DEFINE_ERROR(InvalidInstance);
SUBMOD_DEFINE_ERROR(EmptyInstance);
SUBMOD_DEFINE_ERROR(MalformedSolution);
SUBMOD_DEFINE_ERROR(InvalidParameter);
SUBMOD_DEFINE_ERROR(DomainError);
SUBMOD_DEFINE_ERROR(NonMonotoneOracle);
SUBMOD_DEFINE_ERROR(MisuseError);
SUBMOD_DEFINE_ERROR(InfeasibleNode);
SUBMOD_DEFINE_ERROR(CapExceeded);
SUBMOD_DEFINE_ERROR(BracketingError);
SUBMOD_DEFINE_ERROR(ParseError);

#undef SUBMOD_DEFINE_ERROR

// Raised by the verifier when one of the approximation inequalities fails on
// a concrete instance. Carries the inequality name and a serialized instance
// so the failure can be replayed.
class InequalityViolation : public Error {
 public:
  InequalityViolation(std::string inequality, double slack,
                      std::string instance_dump)
      : Error("inequality '" + inequality + "' violated (slack " +
              std::to_string(slack) + ")\n" + instance_dump),
        inequality_(std::move(inequality)),
        slack_(slack),
        instance_dump_(std::move(instance_dump)) {}

  const std::string& inequality() const { return inequality_; }
  double slack() const { return slack_; }
  const std::string& instance_dump() const { return instance_dump_; }

 private:
  std::string inequality_;
  double slack_;
  std::string instance_dump_;
};

}  // namespace submod
