#include <stdio.h>
#include <stdlib.h>

int sum_first(int *a, int n) {
  int s = 0;
  int i;
  for (i = 0; i <= n; i++)
    s += a[i];
  return s;
}

int main(int argc, char **argv) {
  int a[6] = {1, 2, 3, 4, 5, 100};
  printf("%d\n", sum_first(a, atoi(argv[1])));
  return 0;
}
