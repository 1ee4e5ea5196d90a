// Copyright 2026 The qscreen Authors
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

namespace qscreen {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: malformed files, invalid configuration, unknown ids.
/// The CLI maps these to exit code 1; everything else is an internal error.
class InputError : public Error {
 public:
  using Error::Error;
};

class QasmSyntaxError : public InputError {
 public:
  QasmSyntaxError(int line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class UnsupportedGate : public InputError {
 public:
  explicit UnsupportedGate(std::string name)
      : InputError("unsupported gate '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class QubitOutOfRange : public InputError {
 public:
  using InputError::InputError;
};

class QubitCountOutOfRange : public Error {
 public:
  using Error::Error;
};

class SlotOutOfRange : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class IoError : public InputError {
 public:
  using InputError::InputError;
};

class ParseError : public InputError {
 public:
  ParseError(int line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class LabelNotBinary : public ParseError {
 public:
  using ParseError::ParseError;
};

class TooFewMinoritySamples : public InputError {
 public:
  using InputError::InputError;
};

class RatioError : public InputError {
 public:
  using InputError::InputError;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class SingleClassInput : public Error {
 public:
  using Error::Error;
};

class ExecutionFailure : public Error {
 public:
  using Error::Error;
};

class NoCandidates : public InputError {
 public:
  using InputError::InputError;
};

class UnknownCircuitId : public InputError {
 public:
  explicit UnknownCircuitId(const std::string& id)
      : InputError("unknown circuit id '" + id + "'") {}
};

class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace qscreen
