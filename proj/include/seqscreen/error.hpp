// Copyright 2026 seqscreen contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#pragma once

#include <stdexcept>
#include <string>

namespace seqscreen {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Violated precondition: dimension mismatch, out-of-range parameter.
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// Unreadable/unwritable file or malformed file content.
class IoError : public Error {
  public:
    using Error::Error;
};

/// Numerical failure: empty region, broken screening integrity, non-convergence.
class NumericalError : public Error {
  public:
    using Error::Error;
};

/// Kept dictionary would exceed the configured memory cap.
class MemoryCapExceeded : public Error {
  public:
    using Error::Error;
};

} // namespace seqscreen
