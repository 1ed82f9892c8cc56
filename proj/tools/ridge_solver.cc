#include "ridge/cli_app.h"

int main(int argc, char** argv) {
  ridge::configure_logging();
  return ridge::dispatch(argc, argv);
}
