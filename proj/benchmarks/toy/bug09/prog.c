#include <stdio.h>
#include <stdlib.h>

int last_index(int n) {
  if (n <= 0)
    return -1;
  return n;
}

int main(int argc, char **argv) {
  printf("%d\n", last_index(atoi(argv[1])));
  return 0;
}
