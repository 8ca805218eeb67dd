/* Copyright 2026 The dsieve Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DSIEVE_ERROR_HPP
#define DSIEVE_ERROR_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dsieve {

using Index = std::int64_t;

// Every error names the module that raised it and the offending parameter.
class Error : public std::runtime_error {
 public:
  Error(std::string module, std::string parameter, const std::string& what)
      : std::runtime_error(module + ": " + parameter + ": " + what),
        module_(std::move(module)),
        parameter_(std::move(parameter)) {}

  const std::string& module() const noexcept { return module_; }
  const std::string& parameter() const noexcept { return parameter_; }

 private:
  std::string module_;
  std::string parameter_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class PrecisionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Raised when a sieve stage leaves no survivors inside the window.
class EmptySurvivorError : public Error {
 public:
  explicit EmptySurvivorError(Index n)
      : Error("sieve", "n", "no survivors left after stage " + std::to_string(n)), n_(n) {}

  Index stage() const noexcept { return n_; }

 private:
  Index n_;
};

}  // namespace dsieve

#endif  // DSIEVE_ERROR_HPP
