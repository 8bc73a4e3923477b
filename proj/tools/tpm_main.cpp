#include "tpm/cli.hpp"

int main(int argc, char** argv) {
    return tpm::run_cli(argc, argv);
}
