#include "subexp/cli_app.hpp"

int main(int argc, char** argv) { return subexp::cli::run(argc, argv); }
