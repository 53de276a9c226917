// Copyright 2026 The grafn Authors. All Rights Reserved.
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

namespace grafn {

/// Keeps large freed blocks in the heap instead of returning them to the
/// OS. Training allocates and frees many multi-megabyte temporaries per
/// step; without this each one is re-faulted page by page. No-op outside
/// glibc. Call once at startup, before spawning threads.
void configure_allocator();

}  // namespace grafn
