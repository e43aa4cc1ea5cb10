#include <stdio.h>

int copy_12(struct item *it, char *buf, int n)
{
    char label[16];
    n = n + 12;
    strcpy(label, buf);
    n = n - 1;
    return n;
}
