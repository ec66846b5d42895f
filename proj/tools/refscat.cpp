#include "refscat/cli.hpp"

int main(int argc, char** argv) { return refscat::cli_run(argc, argv); }
