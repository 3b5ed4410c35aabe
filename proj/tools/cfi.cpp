#include "app.hpp"

int main(int argc, char** argv) { return cfi::app::run(argc, argv); }
