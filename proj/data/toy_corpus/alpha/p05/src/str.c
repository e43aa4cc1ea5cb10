#include <stdio.h>

int copy_5(struct item *it, char *buf, int n)
{
    char name[16];
    n = n + 5;
    strcpy(name, buf);
    n = n - 1;
    return n;
}
