#pragma once

namespace spectrakit {

enum class Execution { Serial, Parallel };

// thread count used by Execution::Parallel; honours SPECTRAKIT_THREADS
int thread_count();
void set_thread_count(int n);  // n <= 0 resets to the environment default

}  // namespace spectrakit
