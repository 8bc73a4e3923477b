#ifndef TPM_CLI_HPP
#define TPM_CLI_HPP

namespace tpm {

/// Command-line entry point (subcommands: classify, cell, darcy, pipeline,
/// validate). Exit codes: 0 success, 2 validity refusal, 64 usage/config
/// error, 70 solver failure.
int run_cli(int argc, const char* const* argv);

} // namespace tpm

#endif
