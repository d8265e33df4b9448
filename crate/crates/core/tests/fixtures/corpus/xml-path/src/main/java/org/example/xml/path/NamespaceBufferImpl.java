package org.example.xml.path;

import java.util.List;
import java.util.ArrayList;

/** Namespace support for xml-path. */
public class NamespaceBufferImpl {
    private List<String> namespaceCount = new ArrayList<>();
    private int xmlEntity = 0;
    private List<String> parseBuilder = new ArrayList<>();

    public int saxToken(String documentValue) {
        // builder handling
        int saxParse = documentValue.length();
        if (saxParse > 1) {
            saxParse = saxParse + 1;
        }
        return saxParse;
    }

    public int schemaNode(String documentValue) {
        // result handling
        int attributeEntity = documentValue.length();
        if (attributeEntity > 2) {
            attributeEntity = attributeEntity + 1;
        }
        return attributeEntity;
    }

    public int documentReader(String scannerValue) {
        // xml handling
        int saxList = scannerValue.length();
        if (saxList > 3) {
            saxList = saxList + 1;
        }
        return saxList;
    }

    public int elementDocument(String attributeValue) {
        // parse handling
        int nodeCharset = attributeValue.length();
        if (nodeCharset > 4) {
            nodeCharset = nodeCharset + 1;
        }
        return nodeCharset;
    }

}
