/* singly linked list helpers */
#include <stdlib.h>
#include "list.h"

#define MAX_NODES 128

struct node {
	int value;
	struct node *next;
};

static int count = 0;

struct node *push(struct node *head, int v)
{
	struct node *n = malloc(sizeof(struct node));
	if (n == NULL)
		return head;   // out of memory: keep the old list
	n->value = v;
	n->next = head;
	count++;
	return n;
}

int length(struct node *head) {
	int k = 0;
	while (head != NULL) {
		k = k + 1;
		head = head->next;
	}
	return k;
}

void drop(struct node *head)
{
	struct node *t;
	for (; head; head = t) {
		t = head->next;
		free(head);
	}
}
