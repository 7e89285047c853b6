#pragma once

namespace dou {

// Entry point behind the `dou` binary; exposed for integration tests.
int cli_main(int argc, const char* const* argv);

}  // namespace dou
