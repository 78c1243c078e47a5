namespace unibase {}
