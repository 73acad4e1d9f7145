//==============================================================================
//  schrec_main.cpp -- executable entry point; all logic lives in run_cli so
//  the test suite can drive the interface in-process.
//==============================================================================
#include "schrec/cli.hpp"

int main(int argc, char** argv) { return schrec::cli::run_cli(argc, argv); }
