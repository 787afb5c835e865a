// Copyright 2026 The IMSNN Authors
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


#ifndef IMSNN_ERRORS_H_
#define IMSNN_ERRORS_H_

#include <stdexcept>
#include <string>

namespace imsnn {

enum class ErrorKind {
  kConfig,            // bad run config or command line
  kValidation,        // input violates a precondition (non-binary raster, pixel range)
  kParse,             // malformed architecture string or IDX payload
  kChecksum,          // cached dataset file does not match its checksum
  kCacheMiss,         // offline and the file is not cached
  kNetwork,           // download failed
  kDegenerateOutput,  // all output potentials nonpositive
  kDegenerateRun,     // no trainable sample in an epoch
  kIo,                // filesystem errors
  kGuard,             // oracle size guard exceeded
  kInternal,
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Process exit code for each error category. 0 is success.
int ExitCodeFor(ErrorKind kind);

}  // namespace imsnn

#endif  // IMSNN_ERRORS_H_
