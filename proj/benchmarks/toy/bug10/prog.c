#include <stdio.h>
#include <string.h>

int is_quit(char *s) {
  if (s == "quit")
    return 1;
  return 0;
}

int main(int argc, char **argv) {
  printf("%d\n", is_quit(argv[1]));
  return 0;
}
