#include "meanflow/cli.hpp"

int main(int argc, char** argv) { return meanflow::cli::main_entry(argc, argv); }
