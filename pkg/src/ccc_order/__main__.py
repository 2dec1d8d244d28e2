from ccc_order.cli import main

raise SystemExit(main())
