/*
 Copyright 2026 The dfo Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#pragma once

#include <stdexcept>
#include <string>

namespace dfo {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Mismatched matrix/vector dimensions; the message names the offending field.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// The system violates a structural property (Schur stability,
/// controllability, observability).
class SystemPropertyError : public Error {
public:
    using Error::Error;
};

/// A signal is not persistently exciting at the required order.
class PersistencyError : public Error {
public:
    using Error::Error;
};

/// A constraint system is inconsistent or a gain condition cannot be met.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Numerical breakdown: singular solves, non-SPD inputs, residuals out of
/// tolerance.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration, schema violation, or unparseable input file.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace dfo
