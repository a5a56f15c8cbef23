#pragma once

namespace hwd {

// Caps the OpenMP worker pool. n <= 0 restores the default (available cores).
void set_threads(int n);
int max_threads();
// HWDKIT_THREADS, or 0 when unset/invalid.
int threads_from_env();

}  // namespace hwd
