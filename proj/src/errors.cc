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


#include "imsnn/errors.h"

namespace imsnn {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kChecksum: return "checksum";
    case ErrorKind::kCacheMiss: return "cache-miss";
    case ErrorKind::kNetwork: return "network";
    case ErrorKind::kDegenerateOutput: return "degenerate-output";
    case ErrorKind::kDegenerateRun: return "degenerate-run";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kGuard: return "guard";
    case ErrorKind::kInternal: return "internal";
  }
  return "unknown";
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
    case ErrorKind::kValidation:
      return 2;
    case ErrorKind::kParse:
    case ErrorKind::kChecksum:
    case ErrorKind::kCacheMiss:
    case ErrorKind::kNetwork:
      return 3;
    case ErrorKind::kDegenerateOutput:
    case ErrorKind::kDegenerateRun:
      return 4;
    case ErrorKind::kIo:
      return 5;
    case ErrorKind::kGuard:
    case ErrorKind::kInternal:
      return 1;
  }
  return 1;
}

}  // namespace imsnn
