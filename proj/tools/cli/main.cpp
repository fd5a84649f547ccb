#include "cli/dispatch.hpp"

int main(int argc, char** argv) { return hotspot::cli::dispatch(argc, argv); }
