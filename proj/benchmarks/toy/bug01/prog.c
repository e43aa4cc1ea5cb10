#include <stdio.h>
#include <stdlib.h>

struct item {
  int weight;
  struct item *next;
};

int item_weight(struct item *it) {
  return it->weight;
}

int main(int argc, char **argv) {
  struct item a;
  a.weight = atoi(argv[1]);
  a.next = NULL;
  if (argc > 2)
    printf("%d\n", item_weight(NULL));
  else
    printf("%d\n", item_weight(&a));
  return 0;
}
