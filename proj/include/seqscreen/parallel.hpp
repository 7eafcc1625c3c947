// Copyright 2026 seqscreen contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#pragma once

#include <cstddef>
#include <functional>

namespace seqscreen {

/// Worker threads available for internal parallelism. Honors the
/// SEQSCREEN_THREADS environment variable (positive integer); otherwise the
/// hardware concurrency. Always >= 1.
std::size_t thread_count();

/// Runs fn(task) for task in [0, n_tasks) on up to thread_count() threads.
/// Tasks are independent; callers merge results by task index.
void parallel_for(std::size_t n_tasks, const std::function<void(std::size_t)>& fn);

} // namespace seqscreen
