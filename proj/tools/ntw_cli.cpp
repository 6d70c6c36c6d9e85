#include "ntw/commands.hpp"

int main(int argc, char** argv) { return ntw::app::run_cli(argc, argv); }
