// Copyright 2026 The frets Authors
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

namespace frets {

/// Keeps large tensor buffers inside the process heap instead of returning
/// them to the OS after every free. Training allocates and drops many
/// multi-megabyte temporaries per batch; without this each one is
/// page-faulted in again. No-op outside glibc. Call once from main().
void configure_allocator();

}  // namespace frets
