// Copyright 2026 The rssrisk Authors
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

#ifndef RSSRISK_ERRORS_HPP_
#define RSSRISK_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace rssrisk {

/// Non-finite or otherwise malformed numeric input.
class InvalidInputError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Parameter set violates its invariants (e.g. beta <= 0).
class ParameterError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Scenario / experiment configuration rejected before any stepping.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Operation called outside its stated precondition.
class PreconditionError : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

}  // namespace rssrisk

#endif  // RSSRISK_ERRORS_HPP_
