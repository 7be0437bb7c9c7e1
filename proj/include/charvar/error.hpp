/*
   Copyright 2026 The charvar Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#pragma once

#include <stdexcept>
#include <string>

namespace charvar {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation was violated by the caller.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The rejection sampler ran out of proposals.
class SamplingError : public Error {
public:
    SamplingError(const std::string& what, double acceptance_estimate)
        : Error(what), acceptance_estimate_(acceptance_estimate) {}

    double acceptance_estimate() const { return acceptance_estimate_; }

private:
    double acceptance_estimate_;
};

/// Newton projection onto the relator level set did not converge.
class PolishError : public Error {
public:
    using Error::Error;
};

} // namespace charvar
