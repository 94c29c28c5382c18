//
// Copyright 2026 the dplang authors
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
//

#ifndef DPLANG_ERRORS_HPP_
#define DPLANG_ERRORS_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dplang {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A bounded enumeration ran out before producing the requested member.
class EnumerationExhausted : public Error {
 public:
  using Error::Error;
};

// A witness scan hit its limit without settling every language; `partial`
// is the largest witness position found so far.
class ScanLimitInconclusive : public Error {
 public:
  ScanLimitInconclusive(const std::string& what, std::uint64_t partial)
      : Error(what), partial_(partial) {}
  std::uint64_t partial() const { return partial_; }

 private:
  std::uint64_t partial_;
};

class InvalidDelta : public Error {
 public:
  using Error::Error;
};

class EmptyCandidates : public Error {
 public:
  using Error::Error;
};

// A language supposed to lie inside a distribution's support does not.
class NotContained : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class InstanceError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dplang

#endif  // DPLANG_ERRORS_HPP_
