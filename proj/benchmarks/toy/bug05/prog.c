#include <stdio.h>
#include <stdlib.h>

int factorial(int n) {
  int r = 0;
  int i;
  for (i = 2; i <= n; i++)
    r = r * i;
  return r;
}

int main(int argc, char **argv) {
  printf("%d\n", factorial(atoi(argv[1])));
  return 0;
}
