int main() {
  int a, b, c, t;
  scanf("%d %d %d", &a, &b, &c);
  if (a == b && b == c)
    t = 3;
  else if (a == b || b == c || a == b)
    t = 2;
  else
    t = 0;
  printf("%d\n", t);
  return 0;
}
