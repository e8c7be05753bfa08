#pragma once

namespace icb {

/// Exit codes of the icb tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,     // unexpected internal error
  kExitConfig = 2,       // bad flags, unknown subcommand, unreadable or invalid config
  kExitCertificate = 3,  // a certificate or validation check failed
  kExitNumerical = 4,    // a numerical routine failed
};

/// Parses argv, runs one subcommand, and returns the exit code. Errors are
/// reported on stderr as a single JSON object.
int cli_main(int argc, char** argv);

}  // namespace icb
